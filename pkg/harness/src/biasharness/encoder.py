"""Encoder resolution: pretrained checkpoints or a from-scratch model.

Two spellings are accepted for TrainConfig.encoder:

- "scratch": a small randomly initialized BERT-class model with a word
  vocabulary built from the train split. Runs anywhere, used by the test
  suite; useful for plumbing checks, not for accuracy.
- anything else: a HuggingFace model name or local checkpoint directory,
  loaded with a fresh classification head ("bert-base-uncased" by default).
"""

from __future__ import annotations

import tempfile
from dataclasses import dataclass
from pathlib import Path

from transformers import (
    AutoModelForSequenceClassification,
    AutoTokenizer,
    BertConfig,
    BertForSequenceClassification,
    BertTokenizerFast,
)

from .data import TaskData, build_vocab

SCRATCH = "scratch"

# deliberately tiny: two layers are enough to exercise the training loop
SCRATCH_HIDDEN = 64
SCRATCH_LAYERS = 2
SCRATCH_HEADS = 4


@dataclass
class EncoderBundle:
    tokenizer: object
    new_model: callable  # () -> model with a fresh classification head


def resolve_encoder(name: str, data: TaskData,
                    max_seq_len: int) -> EncoderBundle:
    """Build the tokenizer once and a model factory to call per seed."""
    num_labels = len(data.labels)
    if name == SCRATCH:
        vocab = build_vocab(data)
        vocab_file = Path(tempfile.mkdtemp(prefix="biasharness-")) / "vocab.txt"
        vocab_file.write_text("\n".join(vocab) + "\n", encoding="utf-8")
        tokenizer = BertTokenizerFast(str(vocab_file), do_lower_case=True)
        config = BertConfig(
            vocab_size=len(vocab),
            hidden_size=SCRATCH_HIDDEN,
            num_hidden_layers=SCRATCH_LAYERS,
            num_attention_heads=SCRATCH_HEADS,
            intermediate_size=SCRATCH_HIDDEN * 4,
            max_position_embeddings=max(max_seq_len, 32),
            num_labels=num_labels,
        )
        return EncoderBundle(tokenizer=tokenizer,
                             new_model=lambda: BertForSequenceClassification(config))

    tokenizer = AutoTokenizer.from_pretrained(name)
    return EncoderBundle(
        tokenizer=tokenizer,
        new_model=lambda: AutoModelForSequenceClassification.from_pretrained(
            name, num_labels=num_labels))
