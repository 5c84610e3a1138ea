"""How a flank nick or blob changes the component stiffness and frequency.

A nick removes a full-height strip from one side of the beam; a blob adds
the same strip outside it.  To first order they are exact mirror images.
"""

import numpy as np

from cosserat_defects import RodSpec, assemble_component, defect_stiffness, make_blob, make_nick, modal_estimate

rod = RodSpec(150e-6)
tip_mass = 1.573e-10  # kg

nick = make_nick(rod, s0=100e-6, depth=1.5e-6)
blob = make_blob(rod, s0=100e-6, depth=1.5e-6)
print(f"nick Gamma = {nick.gamma:+.3f}, blob Gamma = {blob.gamma:+.3f}, extent = {nick.extent * 1e6:.1f} um")

dK = defect_stiffness(rod, nick)
print("axial entry of the nick delta :", dK[8, 8], "N/m")
print("blob delta is the exact negative:", np.array_equal(defect_stiffness(rod, blob), -dK))

f0 = modal_estimate(assemble_component(rod, tip_mass=tip_mass)).frequency
print(f"\nwith tip mass, ideal : {f0:10.1f} Hz")
for label, p in (("nick", nick), ("blob", blob)):
    f = modal_estimate(assemble_component(rod, (p,), tip_mass=tip_mass)).frequency
    print(f"with tip mass, {label:5s}: {f:10.1f} Hz ({f - f0:+.1f})")

# The same nick moved along the beam: damage near the clamp costs the most.
print("\nnick position (um from clamp) -> frequency shift (Hz)")
for s0 in (5, 25, 50, 75, 100, 125, 145):
    p = make_nick(rod, s0 * 1e-6, depth=1.5e-6)
    f = modal_estimate(assemble_component(rod, (p,), tip_mass=tip_mass)).frequency
    print(f"  {s0:5.0f}  {f - f0:+8.2f}")
