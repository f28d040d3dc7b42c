"""Candidate pair generation and binary feature templates.

Feature strings are schematic and human-readable on purpose: models stay
inspectable as text files. Template inventory, with '~' joining parts and
'⊥' for an absent neighbor token:

  tp=T1~T2     entity types of the pair
  h1= / h2=    last (head) token of each argument, lowercase
  hh=          both heads combined
  bw=          one per distinct lowercase token strictly between
  db=          bucketed between-token count: 0, 1, 2, 3-5, 6-10, >10
  mb=          count of other mentions strictly between, capped at 3
  wb1= / wa2=  lowercase token just before arg1 / just after arg2, or ⊥
  tpdb=        type pair combined with the distance bucket
"""

from __future__ import annotations

from typing import Sequence

from cner.ner.types import EntityMention, check_mentions
from cner.relex.types import MentionPair
from cner.textcore import Sentence

ABSENT = "⊥"


def generate_pairs(
    sentence: Sentence,
    mentions: Sequence[EntityMention],
    max_token_distance: int = 50,
) -> list[MentionPair]:
    """All in-sentence pairs (earlier mention first) within the distance cap.

    The cap applies to the count of tokens strictly between the mentions and
    bounds the quadratic pair blowup on long sentences.
    """

    check_mentions(sentence, list(mentions))
    ordered = sorted(mentions, key=lambda m: m.token_range)
    pairs = []
    for i in range(len(ordered)):
        for j in range(i + 1, len(ordered)):
            gap = ordered[j].token_range[0] - ordered[i].token_range[1] - 1
            if gap <= max_token_distance:
                pairs.append(MentionPair(sentence.index, ordered[i], ordered[j]))
    return pairs


def _distance_bucket(count: int) -> str:
    if count <= 2:
        return str(count)
    if count <= 5:
        return "3-5"
    if count <= 10:
        return "6-10"
    return ">10"


def extract_features(
    pair: MentionPair,
    sentence: Sentence,
    all_mentions: Sequence[EntityMention] = (),
) -> set[str]:
    """Binary feature set for one pair; pure and deterministic."""

    surfaces = sentence.surfaces()
    a1_first, a1_last = pair.arg1.token_range
    a2_first, a2_last = pair.arg2.token_range
    type_pair = f"{pair.arg1.entity_type}~{pair.arg2.entity_type}"
    h1 = surfaces[a1_last].lower()
    h2 = surfaces[a2_last].lower()
    between = range(a1_last + 1, a2_first)
    bucket = _distance_bucket(len(between))
    mentions_between = sum(
        1
        for m in all_mentions
        if m.token_range != pair.arg1.token_range
        and m.token_range != pair.arg2.token_range
        and m.token_range[0] > a1_last
        and m.token_range[1] < a2_first
    )
    features = {
        f"tp={type_pair}",
        f"h1={h1}",
        f"h2={h2}",
        f"hh={h1}~{h2}",
        f"db={bucket}",
        f"mb={min(mentions_between, 3)}",
        f"wb1={surfaces[a1_first - 1].lower() if a1_first > 0 else ABSENT}",
        f"wa2={surfaces[a2_last + 1].lower() if a2_last + 1 < len(surfaces) else ABSENT}",
        f"tpdb={type_pair}~{bucket}",
    }
    features.update(f"bw={surfaces[i].lower()}" for i in between)
    return features
