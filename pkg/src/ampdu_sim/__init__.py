"""Throughput of blind MPDU duplication in 802.11ac A-MPDU / Two-Level aggregation."""
from .channel import (ErrorModel, RandomSource, ber_from_per, mpdu_delivered_prob,
                      per_from_ber, sample_plan_outcome)
from .engine import SimConfig, SimResult, run_sim
from .frame import (FrameGeometry, MacTimingProfile, Mode, PhyProfile, PsduPlan,
                    analytic_throughput, mpdu_element_bytes, psdu_airtime_us, psdu_bits,
                    validate_plan)
from .oracle import markov_oracle
from .strategy import ALL, BASE, PRESETS, Strategy, build_plan, parse_strategy
from .sweep import best_over_strategies, ratio_eq_thr, sweep_k
from .window import WindowState, apply_back, select_xmin

__version__ = "0.1.0"
