import sys

from feedgame.harness.cli import main

sys.exit(main())
