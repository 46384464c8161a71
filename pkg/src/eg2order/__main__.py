import sys

from eg2order.cli import main

sys.exit(main())
