import sys

from stratgrad.api.cli import main

sys.exit(main())
