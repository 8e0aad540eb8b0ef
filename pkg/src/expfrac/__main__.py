"""Entry point for running expfrac as a module: python -m expfrac"""

from expfrac.cli.main import main

if __name__ == "__main__":
    main()
