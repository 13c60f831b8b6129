import sys

from geotri.cli import main

if __name__ == "__main__":
    sys.exit(main())
