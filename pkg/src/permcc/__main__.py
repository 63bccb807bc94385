import sys

from permcc.cli import main

sys.exit(main())
