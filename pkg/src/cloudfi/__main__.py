import sys

from cloudfi.cli import main

sys.exit(main())
