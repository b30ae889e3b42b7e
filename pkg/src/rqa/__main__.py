import sys

from rqa.cli import main

sys.exit(main())
