from mcdemod.demod.filters import FilterPath, exact_filter, intermediate_filter, positive_filter
from mcdemod.demod.renewal import RenewalStats, activation_count, matched_argmax, phi, renewal_stats
from mcdemod.demod.symbols import CMSymbolSet

__all__ = [
    "CMSymbolSet",
    "FilterPath",
    "RenewalStats",
    "activation_count",
    "exact_filter",
    "intermediate_filter",
    "matched_argmax",
    "phi",
    "positive_filter",
    "renewal_stats",
]
