"""Run the whole claim registry and exit nonzero on any failure."""

import sys

from sutured.cli import main

if __name__ == "__main__":
    sys.exit(main(["verify", *sys.argv[1:]]))
