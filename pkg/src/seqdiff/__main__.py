"""
Module entry point: python -m seqdiff
"""

from seqdiff.cli.main import main

if __name__ == "__main__":
    main()
