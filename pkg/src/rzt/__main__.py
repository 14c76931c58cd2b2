import sys

from rzt.cli import main

sys.exit(main())
