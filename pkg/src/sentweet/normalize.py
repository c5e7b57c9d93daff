"""Tweet text normalization.

Turns raw tweet text into a clean lowercase token stream: URLs and
@-mentions removed, hashtags kept with '#' stripped, symbol/emoji and
abbreviation rewrites applied from a RewriteTable, unmapped emoji dropped.
Numerals and dates are kept. Non-Latin script (e.g. Devanagari) survives
untouched apart from case folding; translation is out of scope.

normalize_tweet is idempotent and deterministic, and the loader rejects
rewrite tables that could break idempotence (a replacement word that is
itself a pattern would be rewritten again on a second pass).
"""

import re
import unicodedata
from dataclasses import dataclass
from importlib import resources

from sentweet.errors import RewriteTableError

_URL_RE = re.compile(r"(?:https?://|www\.)\S+")
_MENTION_RE = re.compile(r"@\w+")
_WS_RE = re.compile(r"\s+")

# Characters a token may contain: any non-uppercase letter (covers caseless
# scripts such as Devanagari), combining marks (Indic matras), decimal
# digits, apostrophe, hyphen.
_EXTRA_TOKEN_CHARS = frozenset("'’-")


def _is_token_char(ch: str) -> bool:
    if ch in _EXTRA_TOKEN_CHARS:
        return True
    if ch.isdecimal():
        return True
    if ch.isalpha():
        return not ch.isupper()
    return unicodedata.category(ch).startswith("M")


def _is_word_pattern(pattern: str) -> bool:
    """Word patterns are matched at word boundaries; emoji/symbol patterns anywhere."""
    return all(ch.isalnum() or ch in "'-" for ch in pattern)


@dataclass(frozen=True)
class RewriteTable:
    """Ordered pattern -> replacement rewrites (longest pattern wins ties).

    Patterns are single words (lowercase ASCII) or emoji codepoint
    sequences; replacements are space-separated lowercase ASCII words.
    """

    entries: tuple[tuple[str, str], ...]

    def __post_init__(self):
        seen = set()
        patterns = set()
        for pattern, replacement in self.entries:
            if not pattern:
                raise RewriteTableError("empty pattern")
            if pattern in seen:
                raise RewriteTableError(f"duplicate pattern: {pattern!r}")
            seen.add(pattern)
            if any(ch.isspace() for ch in pattern):
                raise RewriteTableError(f"pattern must be a single word or emoji sequence: {pattern!r}")
            if not replacement or not re.fullmatch(r"[a-z]+(?: [a-z]+)*", replacement):
                raise RewriteTableError(
                    f"replacement must be lowercase ASCII words: {replacement!r} (pattern {pattern!r})"
                )
            patterns.add(pattern)
        # Idempotence guard: no replacement word may itself be a pattern.
        for pattern, replacement in self.entries:
            for word in replacement.split():
                if word in patterns:
                    raise RewriteTableError(
                        f"replacement word {word!r} (for pattern {pattern!r}) is itself a pattern"
                    )
        object.__setattr__(self, "_regex", self._compile())
        object.__setattr__(self, "_replacements", dict(self.entries))

    def _compile(self):
        # Single alternation, longest pattern first, declared order within
        # ties; re tries alternatives left to right at each position.
        ordered = sorted(
            range(len(self.entries)), key=lambda i: (-len(self.entries[i][0]), i)
        )
        parts = []
        for i in ordered:
            pattern = self.entries[i][0]
            escaped = re.escape(pattern)
            if _is_word_pattern(pattern):
                parts.append(rf"(?<![\w'’-]){escaped}(?![\w'’-])")
            else:
                parts.append(escaped)
        if not parts:
            return None
        return re.compile("|".join(parts))

    def apply(self, text: str) -> str:
        """One simultaneous pass; replacements are never rescanned."""
        if self._regex is None:
            return text
        return self._regex.sub(lambda m: f" {self._replacements[m.group(0)]} ", text)


def load_rewrite_table(source) -> RewriteTable:
    """Parse a rewrite table file: `pattern<TAB>replacement` per line,
    '#'-prefixed comment lines and blank lines ignored."""
    if hasattr(source, "read"):
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    entries = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        if "\t" not in line:
            raise RewriteTableError(f"line {line_no}: expected pattern<TAB>replacement")
        pattern, _, replacement = line.partition("\t")
        entries.append((pattern.strip(), replacement.strip()))
    return RewriteTable(tuple(entries))


def default_rewrite_table() -> RewriteTable:
    ref = resources.files("sentweet.data").joinpath("default_rewrites.tsv")
    with ref.open("r", encoding="utf-8") as fh:
        return load_rewrite_table(fh)


_DEFAULT_TABLE: RewriteTable | None = None


def _default_table() -> RewriteTable:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        _DEFAULT_TABLE = default_rewrite_table()
    return _DEFAULT_TABLE


# Symbols with no word mapping are dropped. Sc/Sk/Sm/So covers emoji,
# dingbats, currency and math signs; Cf/Co/Cs/Cn covers format characters
# (ZWJ, directional marks), surrogates and unassigned codepoints.
_DROP_CATEGORIES = frozenset({"Sc", "Sk", "Sm", "So", "Cf", "Co", "Cs", "Cn"})
# Variation selectors ride along with emoji and carry no text.
_VARIATION_SELECTORS = frozenset(chr(c) for c in range(0xFE00, 0xFE10))


def _drop_unmapped_symbols(text: str) -> str:
    # Replaced by a space, never deleted in place: deleting could weld two
    # input words into a token that never occurred in the tweet.
    out = []
    for ch in text:
        if ch in _VARIATION_SELECTORS or unicodedata.category(ch) in _DROP_CATEGORIES:
            out.append(" ")
        else:
            out.append(ch)
    return "".join(out)


def normalize_tweet(raw: str, table: RewriteTable | None = None) -> str:
    """Normalize raw tweet text to clean lowercase words.

    Steps, in order: NFC + case fold; URL and @-mention removal; hashtag
    '#' stripping; rewrite-table application (one simultaneous pass);
    unmapped symbol/emoji dropping; whitespace collapse. URL/mention
    removal runs before rewrites so patterns never match inside URLs.
    """
    if table is None:
        table = _default_table()
    text = unicodedata.normalize("NFC", raw).lower()
    text = _URL_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    # '#' becomes a space, never a bare deletion: deleting could weld the
    # stripped hashtag onto a preceding '@' or 'www.' and mint a brand-new
    # mention/URL match on re-application, breaking idempotence.
    text = text.replace("#", " ")
    text = table.apply(text)
    text = _drop_unmapped_symbols(text)
    return _WS_RE.sub(" ", text).strip()


def tokenize(clean: str) -> list[str]:
    """Split normalized text into tokens.

    Any character outside the token set (letters, combining marks, digits,
    apostrophe, hyphen) acts as a separator, which subsumes stripping
    punctuation from token edges; pieces emptied by splitting are dropped.
    """
    tokens = []
    current = []
    for ch in clean:
        if _is_token_char(ch):
            current.append(ch)
        elif current:
            tokens.append("".join(current))
            current = []
    if current:
        tokens.append("".join(current))
    return tokens
