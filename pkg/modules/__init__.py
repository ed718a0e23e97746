"""
t-Improper Colouring Modules

This package contains the graph model, large-deviation theory, exact and
heuristic solvers, experiment harness and command line for t-improper
colouring of Erdos-Renyi random graphs.
"""
