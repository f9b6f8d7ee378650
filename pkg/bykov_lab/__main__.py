import sys

from bykov_lab.cli import main

sys.exit(main())
