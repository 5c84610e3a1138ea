"""Write a defective beam as a reusable component file and read it back."""

import sys
import tempfile
from pathlib import Path

import numpy as np

from cosserat_defects import RodSpec, assemble_component, export_component, load_component, make_nick
from cosserat_defects.component import read_matrix_text

out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())
rod = RodSpec(150e-6)
component = assemble_component(rod, (make_nick(rod, 100e-6, depth=1.5e-6),), name="nicked_beam",
                               tip_mass=1.573e-10)

json_path = export_component(component, out_dir / "nicked_beam.json")
text_path = export_component(component, out_dir / "nicked_beam.txt", format="matrix-text")

doc = load_component(json_path)
mats = read_matrix_text(text_path)
print("wrote", json_path, "and", text_path)
print("dof order:", " ".join(doc["dof_order"]))
print("JSON round trip exact :", np.array_equal(doc["stiffness_ideal"], component.K_ideal))
print("text round trip exact :", np.array_equal(mats["stiffness_defect_delta"], component.K_defect_delta))
