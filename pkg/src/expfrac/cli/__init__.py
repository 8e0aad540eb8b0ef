"""expfrac command-line interface."""
