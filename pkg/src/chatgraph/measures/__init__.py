"""Topological measure implementations, grouped by flavor.

paths: shortest-path measures (closeness, eccentricity, betweenness,
diameter/radius/average distance). local: neighborhood measures (degree,
strength, transitivity, Burt constraint, reciprocity, assortativity,
density). spectral: eigenvector/HITS/alpha/power/pagerank/subgraph.
connectivity: components, articulation points, cohesion/adhesion, cliques.
community: detection, modularity, vertex roles, coreness.

The engine module one level up wires these to graph views with lazy
caching; everything here is a pure function of dense matrices.
"""
