"""``python -m neurogeom <command> ...`` runs the same CLI as the
``neurogeom`` console script and exits with its status."""

from . import run_from_terminal

if __name__ == "__main__":
    run_from_terminal()
