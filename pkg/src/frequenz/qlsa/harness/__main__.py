# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Run the command line with `python -m frequenz.qlsa.harness`."""

import sys

from ._cli import main

sys.exit(main())
