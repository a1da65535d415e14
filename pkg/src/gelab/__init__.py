"""gelab: a virtual-item exchange laboratory.

Simulates an order-matched item exchange under policy interventions
(transaction tax, item sink) and estimates intervention effects with
quasi-experimental designs: volume-weighted price index, regression
discontinuity, regression kink, difference-in-differences, pre-trend
diagnostics, and structural-break tests.
"""

__version__ = "0.1.0"

from gelab.panel import Panel, PanelObservation

__all__ = ["Panel", "PanelObservation", "__version__"]
