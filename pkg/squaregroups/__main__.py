"""Entry point for running squaregroups as a module."""

from .cli import main

if __name__ == "__main__":
    main()
