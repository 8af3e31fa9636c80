"""Exact verification toolkit for Gaudin-type Poisson brackets and their braided analogs."""
