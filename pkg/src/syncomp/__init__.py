"""Compressed syndrome-measurement schedules for stabilizer codes."""

from .gf2 import BitMatrix, GF2mField
from .classical import (ClassicalCode, bch_parity_check, classical_mwe_decode,
                        min_distance_bruteforce, repetition_parity_check)
from .qcode import (CssCode, concatenate, logical_representatives,
                    max_syndrome_weight, rotated_surface_code, steane_code,
                    tetrahedral_code)
from .compress import (MeasurementSchedule, build_schedule, compress_checks,
                       data_syndrome_compose, greedy_disjoint_partition,
                       schedule_stats, tetrahedral_sufficient_z,
                       theorem1_certificate)
from .circuits import (MeasurementCircuit, circuit_distance_probe,
                       propagate_fault, synthesize_product_measurement)
from .decode import (DecodeVerdict, FaultModel, build_fault_model, mwe_decode,
                     quantum_lookup_decode, two_step_decode)
from .sim import (NoiseModel, TrialBatch, estimate_logical_rate, plan_shots,
                  run_trials)
from .analyze import (RateCurve, find_crossing, find_pseudothreshold,
                      fit_suppression_slope, shor_repetition_bound)

__version__ = "0.1.0"
