"""Regenerate the sample input documents under inputs/."""
from pathlib import Path

from twistedbundles.catnerve import FiniteCategory
from twistedbundles.groups import cyclic_group, symmetric_group
from twistedbundles.serialize import complex_to_json, contraction_to_json, document, write_document
from twistedbundles.simplicial import boundary_of_simplex, chain_complex, delta, ez_contraction, minimal_circle

out = Path(__file__).resolve().parent.parent / "inputs"
out.mkdir(exist_ok=True)


def save(name, kind, body):
    body = {k: v for k, v in body.items() if k != "kind"}
    write_document(document(kind, body), out / name)


for G, name in [(cyclic_group(2), "z2"), (cyclic_group(3), "z3"), (symmetric_group(3), "s3")]:
    save(f"{name}.json", "group", G.to_json())

S1 = minimal_circle()
save("s1.json", "simplicial_set", S1.to_json())
sigma = S1.generators[1][0]
save("rho.json", "twisting_function", {"values": {sigma: cyclic_group(2).names[1]}})
save("rho_z3.json", "twisting_function", {"values": {sigma: cyclic_group(3).names[1]}})
save("rho_s3.json", "twisting_function", {"values": {sigma: symmetric_group(3).names[1]}})

triangle = boundary_of_simplex(2)
save("triangle_boundary.json", "simplicial_set", triangle.to_json())
save("hexagon.json", "poset", {"name": "hexagon", "elements": ["0", "1", "2", "01", "02", "12"],
                               "relations": [["0", "01"], ["1", "01"], ["0", "02"], ["2", "02"],
                                             ["1", "12"], ["2", "12"]]})
save("z2_category.json", "category", FiniteCategory.from_group(cyclic_group(2)).to_json())
save("arcs3.json", "cover", {"index": ["a", "b", "c"], "faces": [["a", "b"], ["b", "c"], ["a", "c"]]})
save("chain_triangle_boundary.json", "chain_complex", complex_to_json(chain_complex(triangle)))
save("ez_d1xd1.json", "contraction", contraction_to_json(ez_contraction(delta(1), delta(1))))
