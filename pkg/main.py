import sys

from app.controllers.cliController import main

if __name__ == "__main__":
    sys.exit(main())
