import sys

from fsoqkd.main import main

sys.exit(main())
