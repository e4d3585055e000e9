"""
Main entry point for the CLI module when executed with python -m charp_closure.cli
"""

from .main import main

if __name__ == "__main__":
    main()
