import sys

from bibnet.cli import main

sys.exit(main())
