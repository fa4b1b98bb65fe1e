# SPDX-License-Identifier: Apache-2.0.

import sys

from affdim.cli import main

sys.exit(main())
