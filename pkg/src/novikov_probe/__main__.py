"""Module entry point for python -m novikov_probe."""

from novikov_probe.cli import main


if __name__ == "__main__":
    main()
