"""Entity mention extraction: rule/gazetteer, learned tagger, remote adapter."""

from cner.ner.types import (
    ENTITY_TYPES,
    EntityMention,
    MentionOutOfRangeError,
    OverlappingMentionsError,
)
from cner.ner.bio import BIO_TAGS, LengthMismatchError, decode_bio, encode_bio
from cner.ner.gazetteer import Gazetteer, gazetteer_extract, load_gazetteer
from cner.ner.perceptron import (
    EmptyCorpusError,
    IllFormedGoldError,
    TaggerModel,
    load_tagger,
    save_tagger,
    tag_sentence,
    train_tagger,
)
from cner.ner.remote import ProtocolError, RemoteUnavailableError, remote_extract
from cner.ner.registry import (
    ExtractorDescriptor,
    ExtractorRegistry,
    UnknownExtractorError,
)

__all__ = [
    "ENTITY_TYPES",
    "EntityMention",
    "OverlappingMentionsError",
    "MentionOutOfRangeError",
    "BIO_TAGS",
    "LengthMismatchError",
    "encode_bio",
    "decode_bio",
    "Gazetteer",
    "load_gazetteer",
    "gazetteer_extract",
    "TaggerModel",
    "EmptyCorpusError",
    "IllFormedGoldError",
    "train_tagger",
    "tag_sentence",
    "save_tagger",
    "load_tagger",
    "RemoteUnavailableError",
    "ProtocolError",
    "remote_extract",
    "ExtractorDescriptor",
    "ExtractorRegistry",
    "UnknownExtractorError",
]
