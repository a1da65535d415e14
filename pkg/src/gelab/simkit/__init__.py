from gelab.simkit.config import (
    ConfigInvalid,
    InjectedEffect,
    RK_TAX_SLOPE,
    ScenarioConfig,
    SinkRound,
    SynthConfig,
    load_scenario_config,
    load_synth_config,
)
from gelab.simkit.replicate import ReplicationResult, derive_seed, replicate
from gelab.simkit.scenario import ScenarioResult, run_scenario
from gelab.simkit.synth import synth_panel

__all__ = [
    "ConfigInvalid",
    "InjectedEffect",
    "RK_TAX_SLOPE",
    "ReplicationResult",
    "ScenarioConfig",
    "ScenarioResult",
    "SinkRound",
    "SynthConfig",
    "derive_seed",
    "load_scenario_config",
    "load_synth_config",
    "replicate",
    "run_scenario",
    "synth_panel",
]
