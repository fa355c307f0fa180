"""Shared record type for everything a task dataset can contain.

Builders produce their own typed outputs (neighborhood windows, target
pairs); dataset assembly converts them all into AugmentedExample records,
the one currency the backtranslator, exporter, and downstream consumers
see. ``kinds`` keeps the bias kinds a record embodies, independent of its
task label: an unbiased-looking OTH record built from a lexically biased
sentence still admits lexical-only backtranslation.
"""

from __future__ import annotations

from dataclasses import dataclass

REGULAR = "REGULAR"
BANC = "BANC"
ABTA = "ABTA"
EBTA = "EBTA"


def bt_of(provenance: str) -> str:
    return f"BT-of-{provenance}"


@dataclass(frozen=True)
class AugmentedExample:
    id: str
    text: str
    label: str
    provenance: str
    event_id: str
    sources: tuple[str, ...]
    sentence_ids: tuple[str, ...]
    kinds: frozenset[str]
    target: str | None = None
    split: str = "train"
