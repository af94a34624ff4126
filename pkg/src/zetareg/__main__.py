import sys

from .cli_reporter import main

sys.exit(main())
