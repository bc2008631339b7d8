import sys

from ssmodes.cli import main

sys.exit(main())
