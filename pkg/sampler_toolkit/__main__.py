import sys

from sampler_toolkit.cli import main

sys.exit(main())
