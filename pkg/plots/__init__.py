"""Figure scripts that re-render the reference plot suite from CSV artifacts.

This package reads only the CSV files written by the `cbreak` command line
(never the solver library itself) and produces one image per catalog figure.
See plots/README.md for the catalog and the commands that produce each input.
"""
