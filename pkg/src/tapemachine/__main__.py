import sys

from tapemachine.cli import main

sys.exit(main())
