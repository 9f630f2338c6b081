"""
Vocabulary for SeqDiff
Token <-> id bijection with four reserved ids and whitespace/char tokenization
"""

from collections import Counter
from pathlib import Path
from typing import Dict, Iterable, List, Sequence

from seqdiff.core.errors import DomainError

PAD_TOKEN = "<pad>"
BOS_TOKEN = "<bos>"
EOS_TOKEN = "<eos>"
UNK_TOKEN = "<unk>"
RESERVED_TOKENS = (PAD_TOKEN, BOS_TOKEN, EOS_TOKEN, UNK_TOKEN)

PAD_ID = 0
BOS_ID = 1
EOS_ID = 2
UNK_ID = 3
NUM_RESERVED = len(RESERVED_TOKENS)

TOKENIZER_MODES = ("whitespace", "char")


def tokenize(text: str, mode: str = "whitespace") -> List[str]:
    """Split text into tokens by whitespace, or into characters (spaces dropped)"""
    if mode == "whitespace":
        return text.split()
    if mode == "char":
        return [ch for ch in text if not ch.isspace()]
    raise DomainError(f"unknown tokenizer mode '{mode}'")


def detokenize(tokens: Sequence[str], mode: str = "whitespace") -> str:
    return "".join(tokens) if mode == "char" else " ".join(tokens)


class Vocabulary:
    """Dense id space [0, V) whose first four ids are pad, bos, eos and unk"""

    def __init__(self, tokens: Iterable[str] = ()):
        self._id_to_token: List[str] = list(RESERVED_TOKENS)
        self._token_to_id: Dict[str, int] = {
            tok: i for i, tok in enumerate(RESERVED_TOKENS)
        }
        for token in tokens:
            if token in self._token_to_id:
                continue
            self._token_to_id[token] = len(self._id_to_token)
            self._id_to_token.append(token)

    def __len__(self) -> int:
        return len(self._id_to_token)

    def __contains__(self, token: str) -> bool:
        return token in self._token_to_id

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self._id_to_token == other._id_to_token

    @property
    def size(self) -> int:
        return len(self._id_to_token)

    @property
    def all_tokens(self) -> List[str]:
        """Every token in id order, reserved ones included"""
        return list(self._id_to_token)

    @property
    def tokens(self) -> List[str]:
        """Non-reserved tokens in id order"""
        return self._id_to_token[NUM_RESERVED:]

    @classmethod
    def build(
        cls, token_lists: Iterable[Sequence[str]], min_freq: int = 1
    ) -> "Vocabulary":
        """
        Build a vocabulary from tokenized text

        Tokens seen fewer than min_freq times are left out (they map to unk).
        Order is by descending frequency, ties broken alphabetically.
        """
        counts: Counter = Counter()
        for tokens in token_lists:
            counts.update(tokens)
        kept = [tok for tok, c in counts.items() if c >= min_freq]
        kept.sort(key=lambda tok: (-counts[tok], tok))
        return cls(tok for tok in kept if tok not in RESERVED_TOKENS)

    @classmethod
    def synthetic(cls, size: int) -> "Vocabulary":
        """Vocabulary of `size` ids whose symbols are named '0', '1', ..."""
        if size <= NUM_RESERVED:
            raise DomainError(
                f"synthetic vocabulary needs more than {NUM_RESERVED} ids, got {size}"
            )
        return cls(str(k) for k in range(size - NUM_RESERVED))

    def token_to_id(self, token: str) -> int:
        return self._token_to_id.get(token, UNK_ID)

    def id_to_token(self, idx: int) -> str:
        if not 0 <= idx < len(self._id_to_token):
            raise DomainError(f"token id {idx} outside [0, {len(self)})")
        return self._id_to_token[idx]

    def encode(self, tokens: Sequence[str]) -> List[int]:
        return [self.token_to_id(tok) for tok in tokens]

    def decode(self, ids: Sequence[int], strip_special: bool = True) -> List[str]:
        return [
            self.id_to_token(int(i))
            for i in ids
            if not (strip_special and int(i) in (PAD_ID, BOS_ID, EOS_ID))
        ]

    def save(self, path: str) -> None:
        """Write non-reserved tokens, one per line; line k holds id k + 4"""
        text = "".join(f"{tok}\n" for tok in self.tokens)
        Path(path).write_text(text, encoding="utf-8")

    @classmethod
    def load(cls, path: str) -> "Vocabulary":
        """
        Read a file written by save

        Raises:
            DomainError: If a line repeats an earlier line or a reserved token
        """
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        seen = set(RESERVED_TOKENS)
        for number, token in enumerate(lines, start=1):
            if token in seen:
                raise DomainError(
                    f"vocabulary file '{path}' repeats token {token!r} on line {number}"
                )
            seen.add(token)
        return cls(lines)
