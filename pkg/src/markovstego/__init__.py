"""Markov-chain text steganography with Huffman-coded candidate pools."""
from .coder import (
    CandidatePool,
    FixedLengthCode,
    HuffmanTree,
    build_candidate_pool,
    build_huffman_tree,
    codeword_of,
    decode_word,
    fixed_length_codebook,
)
from .corpus import (
    BOS,
    EOS,
    UNK,
    CorpusStats,
    Dictionary,
    PreprocessConfig,
    build_dictionary,
    build_keyword_list,
    corpus_stats,
    normalize_sentence,
    read_sentences,
)
from .errors import (
    DecodeMismatch,
    EmptyCorpusError,
    EmptyPool,
    IngestError,
    ModelParseError,
    NotInPool,
    StegoError,
    TruncatedPayload,
    UnknownContext,
)
from .evaluate import bpw_stats, embedding_rate, perplexity
from .markov import (
    Distribution,
    MarkovModel,
    ModelConfig,
    load_model,
    model_fingerprint,
    parse_model,
    save_model,
    serialize_model,
    train,
)
from .stego import EmbedConfig, EmbedTrace, Payload, embed, extract, frame_payload, hide, reveal, unframe_payload

__version__ = "0.1.0"
