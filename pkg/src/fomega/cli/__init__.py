"""Command-line front end: surface syntax, printing, derivation files and commands."""

def main(argv=None) -> int:
    from .main import run
    return run(argv)
