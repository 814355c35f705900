import sys

from lexcluster.main import main

sys.exit(main())
