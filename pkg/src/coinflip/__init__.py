"""Simulator and analysis library for loss-tolerant quantum coin flipping."""

from .analytics import (alice_bias_bound, bias_report, bob_bias,
                        cunning_agreement, fair_alpha2, reference_table)
from .catalog import (Family, StateFamily, StateLabel, basis,
                      committed_density, computational_basis, honest_ensemble,
                      state)
from .channel import ChannelParams, Pulse, emit_pulse, transmit
from .discrimination import (INCONCLUSIVE, DiscriminationStats,
                             computational_usd_ambainis, stats, usd_pure_pair)
from .harness import (BiasEstimate, ExperimentConfig, run_experiment,
                      wilson_interval)
from .protocols import (LossPolicy, PlayerHooks, ProtocolId, Transcript,
                        VariantFlags, Verdict, default_flags, honest_hooks,
                        run)
from .quantum import (DensityMatrix, MeasurementOutcome, Povm,
                      ProjectiveMeasurement, QuantumState, density_of,
                      helstrom_success, measure_povm, measure_projective, mix,
                      normalize, steer_epr, trace_distance)
from .rng import RandomStream
from .strategies import Side, StrategyId, make

__version__ = "0.1.0"
