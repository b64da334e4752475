import sys

from hwatopics.cli import main

sys.exit(main())
