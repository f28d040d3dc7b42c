"""Every extractor's output satisfies the mention invariants, whatever the
sentence: valid token ranges, spans equal to the covered tokens' union, no
overlaps within one extractor's output."""

from __future__ import annotations

import random

from helpers import gazetteer_training_corpus, spanish_like_text, stub_remote
from cner.ner.gazetteer import Gazetteer, gazetteer_extract
from cner.ner.perceptron import tag_sentence, train_tagger
from cner.ner.remote import remote_extract
from cner.ner.types import ENTITY_TYPE_SET, EntityMention
from cner.textcore import Sentence, segment


def assert_valid_mentions(sentence: Sentence, mentions: list[EntityMention]) -> None:
    taken: set[int] = set()
    for m in mentions:
        first, last = m.token_range
        assert 0 <= first <= last < len(sentence.tokens)
        assert m.span.start == sentence.tokens[first].span.start
        assert m.span.end == sentence.tokens[last].span.end
        assert m.entity_type in ENTITY_TYPE_SET
        assert 0.0 <= m.confidence <= 1.0
        covered = set(range(first, last + 1))
        assert not (covered & taken), "extractor produced overlapping mentions"
        taken |= covered


def random_gazetteer(rng: random.Random) -> Gazetteer:
    gaz = Gazetteer("random")
    words = ["Juan", "María", "Cali", "Bogotá", "casa", "café", "EE.UU.", "Sr."]
    entries = set()
    for _ in range(rng.randint(1, 10)):
        entry = tuple(rng.choice(words) for _ in range(rng.randint(1, 2)))
        if entry not in entries:
            entries.add(entry)
            gaz.add(entry, rng.choice(tuple(ENTITY_TYPE_SET)))
    return gaz


def test_gazetteer_outputs_valid_on_random_sentences():
    rng = random.Random(77)
    for _ in range(60):
        gaz = random_gazetteer(rng)
        doc = segment(spanish_like_text(rng))
        for sentence in doc.sentences:
            mentions = gazetteer_extract(sentence, gaz, heuristic_caps=rng.random() < 0.5)
            assert_valid_mentions(sentence, mentions)


def test_tagger_outputs_valid_on_random_sentences():
    rng = random.Random(78)
    model = train_tagger(gazetteer_training_corpus(rng, 20), epochs=3, seed=0)
    for _ in range(40):
        doc = segment(spanish_like_text(rng))
        for sentence in doc.sentences:
            assert_valid_mentions(sentence, tag_sentence(model, sentence))


def test_remote_stub_outputs_valid():
    rng = random.Random(79)

    def scattershot(request):
        n = len(request["tokens"])
        mentions = []
        for _ in range(4):
            first = rng.randrange(-1, max(n, 1) + 1)
            last = first + rng.randrange(0, 3)
            mentions.append(
                {
                    "type": rng.choice(["PER", "GPE", "ZZZ"]),
                    "first": first,
                    "last": last,
                    "confidence": rng.uniform(-0.5, 1.5),
                }
            )
        return 200, {"mentions": mentions}

    with stub_remote(scattershot) as url:
        for _ in range(15):
            doc = segment(spanish_like_text(rng))
            for sentence in doc.sentences[:2]:
                mentions, _ = remote_extract(url, sentence, timeout=2.0)
                assert_valid_mentions(sentence, mentions)
