"""Critical bases for unique expansions over three-letter alphabets."""
from .words import AdmissibleSeq, EventuallyPeriodicWord, classify, derived, successor
from .expand import Alphabet, critical_base_of_sequence, is_unique
from .critical import component_interval, in_cantor, p_m, sequence_for_m

__all__ = [
    "AdmissibleSeq", "EventuallyPeriodicWord", "classify", "derived", "successor",
    "Alphabet", "critical_base_of_sequence", "is_unique",
    "component_interval", "in_cantor", "p_m", "sequence_for_m",
]
