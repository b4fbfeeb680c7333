"""
projclust entry point
Loads .env, then runs the command line
"""
import sys
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

from projclust import cli_main  # noqa: E402

if __name__ == '__main__':
    sys.exit(cli_main(sys.argv[1:]))
