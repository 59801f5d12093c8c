"""
The positive cone in the Poincare disk
======================================

For a rank-3 lattice the projectivised positive cone is the hyperbolic
plane. Root walls become circular arcs meeting the boundary at right
angles; isotropic rays sit on the boundary.
"""
from pathlib import Path

from conewalk.hyperviz import build_scene, render_scene
from conewalk.surfaces import example_registry

M = example_registry("k3_rank3").model.lattice

scene = build_scene(M, 50, [("P", (1, 0, 0))])
out = Path(__file__).with_name("k3_disk.svg")
render_scene(scene, out)
print(f"{len(scene.walls)} walls written to {out.name}")
