import sys

from signalpower.cli import main

sys.exit(main())
