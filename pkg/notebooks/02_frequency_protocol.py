"""
The frequency route
===================

Same job, but the extra degree of freedom is frequency.  A wavelength
division multiplexer sorts the photons into two modes and a frequency
shifter wipes the colour, after which the optics are identical.
"""

# %%
import numpy as np

from onestep_ghz import (
    ElementKind,
    GhzPolState,
    all_ghz_states,
    attach_frequency_entanglement,
    attach_spatial_entanglement,
    make_ghz,
    run_frequency_protocol,
    run_spatial_protocol,
)
from onestep_ghz.elements import layer, run_pipeline

g = GhzPolState("0110", "+")
freq = attach_frequency_entanglement(make_ghz(4, g.bits, g.sign))
after = run_pipeline(freq, layer(ElementKind.WDM, 4) + layer(ElementKind.FS, 4))

# After the WDM and FS layers the state is exactly the spatial starting point.
print(after == attach_spatial_entanglement(make_ghz(4, g.bits, g.sign)))

# %%
# With the same seed both protocols see the same detector click.
agree = 0
for h in all_ghz_states(4):
    for seed in range(25):
        a = run_spatial_protocol(h, np.random.default_rng(seed))
        b = run_frequency_protocol(h, np.random.default_rng(seed))
        agree += a.pattern == b.pattern and a.corrections == b.corrections
print(agree, "of", 16 * 25, "runs agree")
