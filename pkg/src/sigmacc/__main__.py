import sys
from sigmacc.cli import main

sys.exit(main())
