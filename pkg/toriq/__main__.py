import sys

from toriq.main import main

sys.exit(main())
