"""
Correcting a bit flip with spatial entanglement
===============================================

Walk one noisy three-photon GHZ state through the optics and look at the
state after every layer of elements.
"""

# %%
import numpy as np

from onestep_ghz import (
    ElementKind,
    GhzPolState,
    attach_spatial_entanglement,
    make_ghz,
    port_distribution,
    run_spatial_protocol,
)
from onestep_ghz.elements import layer, run_pipeline


def show(title, state):
    print(title)
    for ket, amp in sorted(state.terms.items()):
        labels = " ".join(f"{l.pol}{l.spatial.name.lower()}" for l in ket)
        print(f"  {amp.real:+.3f}  {labels}")
    print()

# %%
# Party 0 suffered a bit flip and the whole state a phase flip.
noisy = GhzPolState("100", "-")
state = attach_spatial_entanglement(make_ghz(3, noisy.bits, noisy.sign))
show("after the source", state)

# %%
# Half-wave plates only touch the photons travelling in mode 2.
state = run_pipeline(state, layer(ElementKind.HWP, 3))
show("after the HWP layer", state)

# %%
# The polarizing beam splitters turn polarization into a port number.
state = run_pipeline(state, layer(ElementKind.PBS, 3))
show("after the PBS layer", state)
print("port patterns:", port_distribution(state))

# %%
# Only two detector patterns can fire and they are complements of each other.
# Whichever fires, flipping the parties that saw port 1 gives back 000+.
rng = np.random.default_rng(3)
for _ in range(4):
    out = run_spatial_protocol(noisy, rng)
    print(out.pattern_str, "->", [str(op) for op in out.corrections], "fidelity", round(out.fidelity, 12))
