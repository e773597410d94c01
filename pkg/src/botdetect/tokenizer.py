"""Tweet tokenizer compatible with the published Twitter GloVe vocabularies.

Rule order is fixed: URL, user mention, hashtag, emoji/emoticon, number,
all-caps, elongation, lowercase. Tag tokens come from a closed set; anything
unmappable passes through as its lowercase self.
"""

from __future__ import annotations

import re

HASHTAG = "<hashtag>"
URL = "<url>"
NUMBER = "<number>"
USER = "<user>"
SMILE = "<smile>"
HEART = "<heart>"
LOLFACE = "<lolface>"
NEUTRALFACE = "<neutralface>"
ANGRYFACE = "<angryface>"
ALLCAPS = "<allcaps>"
ELONG = "<elong>"
REPEAT = "<repeat>"

TAG_SET = frozenset(
    {
        HASHTAG,
        URL,
        NUMBER,
        USER,
        SMILE,
        HEART,
        LOLFACE,
        NEUTRALFACE,
        ANGRYFACE,
        ALLCAPS,
        ELONG,
        REPEAT,
    }
)

TokenSequence = list[str]

_URL_RE = re.compile(r"(?:https?://\S+|www\.\S+)", re.IGNORECASE)
_USER_RE = re.compile(r"(?<!\w)@\w+")
_HASHTAG_RE = re.compile(r"(?<!\S)#(\w+)")
# Repeated sentence punctuation; only applied when the <repeat> tag is enabled.
_PUNCT_REPEAT_RE = re.compile(r"([!?.])[!?.]+")

# Emoticons follow the eyes/nose/mouth pattern of the GloVe preprocessing
# script; reversed (mouth-first) variants are accepted for smiles and frowns.
_EYES = r"[8:=;]"
_NOSE = r"['`\-]?"
_SMILE_RE = re.compile(rf"(?:{_EYES}{_NOSE}[)\]dD]+|[(\[]+{_NOSE}{_EYES})$")
_LOLFACE_RE = re.compile(rf"{_EYES}{_NOSE}[pP]+$")
_ANGRYFACE_RE = re.compile(rf"(?::'\(+|{_EYES}{_NOSE}[(\[]+|[)\]]+{_NOSE}{_EYES})$")
_NEUTRALFACE_RE = re.compile(rf"{_EYES}{_NOSE}[/|l*]$")
_HEART_RE = re.compile(r"<+3+$")

_NUMBER_RE = re.compile(r"[-+]?\d+(?:[.,]\d+)*$")
# Any unicode letter repeated more than twice collapses to two occurrences.
_ELONG_RE = re.compile(r"([^\W\d_])\1{2,}", re.UNICODE)

# Common unicode emoji mapped onto the five emoticon tags; anything not
# listed passes through untouched.
_EMOJI_TAG = {}
for _c in "\U0001f600\U0001f601\U0001f603\U0001f604\U0001f60a\U0001f642☺":
    _EMOJI_TAG[_c] = SMILE
for _c in "❤♥\U0001f495\U0001f496\U0001f499\U0001f49a\U0001f49b":
    _EMOJI_TAG[_c] = HEART
for _c in "\U0001f602\U0001f923\U0001f606\U0001f60b\U0001f61b\U0001f61c\U0001f61d":
    _EMOJI_TAG[_c] = LOLFACE
for _c in "\U0001f610\U0001f611":
    _EMOJI_TAG[_c] = NEUTRALFACE
for _c in "\U0001f620\U0001f621☹\U0001f641\U0001f61e\U0001f622\U0001f62d\U0001f4a2":
    _EMOJI_TAG[_c] = ANGRYFACE

_VARIATION_SELECTOR = "️"


def _emoticon_tag(token: str) -> str | None:
    stripped = token.replace(_VARIATION_SELECTOR, "")
    if stripped and all(ch == stripped[0] for ch in stripped):
        tag = _EMOJI_TAG.get(stripped[0])
        if tag is not None:
            return tag
    if _HEART_RE.fullmatch(stripped):
        return HEART
    if _SMILE_RE.fullmatch(stripped):
        return SMILE
    if _LOLFACE_RE.fullmatch(stripped):
        return LOLFACE
    if _ANGRYFACE_RE.fullmatch(stripped):
        return ANGRYFACE
    if _NEUTRALFACE_RE.fullmatch(stripped):
        return NEUTRALFACE
    return None


def _expand_token(token: str, tokens_out: list[str]) -> None:
    if token in TAG_SET:
        tokens_out.append(token)
        return
    tag = _emoticon_tag(token)
    if tag is not None:
        tokens_out.append(tag)
        return
    if _NUMBER_RE.fullmatch(token):
        tokens_out.append(NUMBER)
        return
    trailing = []
    if len(token) >= 2 and token.isalpha() and token.isupper():
        trailing.append(ALLCAPS)
    collapsed = _ELONG_RE.sub(r"\1\1", token)
    if collapsed != token:
        trailing.append(ELONG)
        token = collapsed
    tokens_out.append(token.lower())
    tokens_out.extend(trailing)


def tokenize(text: str, repeat_tag: bool = False) -> TokenSequence:
    """Turn raw tweet text into a token sequence.

    ``repeat_tag`` enables the optional <repeat> tag for runs of repeated
    sentence punctuation; it is off by default.
    """
    s = _URL_RE.sub(f" {URL} ", text)
    s = _USER_RE.sub(f" {USER} ", s)
    s = _HASHTAG_RE.sub(lambda m: f" {HASHTAG} {m.group(1)} ", s)
    if repeat_tag:
        s = _PUNCT_REPEAT_RE.sub(lambda m: f" {m.group(1)} {REPEAT} ", s)
    out: list[str] = []
    for raw in s.split():
        _expand_token(raw, out)
    return out


def plain_words(tokens: TokenSequence) -> list[str]:
    """The non-tag subsequence of a token sequence, in order."""
    return [t for t in tokens if t not in TAG_SET]
