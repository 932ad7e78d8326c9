"""Accountable ring signatures and a simulated contract-wallet chain."""

from ._acwallet import (
    AcwError,
    Chain,
    PublicParams,
    canonical_message,
    individual_keygen,
    judge,
    okgen,
    open,
    proof_signer,
    rsign,
    run_bench,
    run_suite,
    rverify,
    rverify_cost,
    setup,
    ukgen,
)

__all__ = [
    "AcwError",
    "Chain",
    "PublicParams",
    "canonical_message",
    "individual_keygen",
    "judge",
    "okgen",
    "open",
    "proof_signer",
    "rsign",
    "run_bench",
    "run_suite",
    "rverify",
    "rverify_cost",
    "setup",
    "ukgen",
]
