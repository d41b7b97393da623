import sys

from metricity.cli import main

sys.exit(main())
