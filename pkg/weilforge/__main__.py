import sys

from weilforge.main import main

sys.exit(main())
