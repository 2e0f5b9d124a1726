import re
from typing import List

ENUMERATION_PREFIX = re.compile(r"^\s*(\d+[.)]|[-*•])\s*")


def strip_enumeration(line: str) -> str:
    # Repeated so that parsing already-cleaned output changes nothing
    stripped = ENUMERATION_PREFIX.sub("", line, count=1)
    while stripped != line:
        line = stripped
        stripped = ENUMERATION_PREFIX.sub("", line, count=1)
    return line.strip()


def parse_generated(completion: str, n_max: int) -> List[str]:
    """
    Split a generation into clean utterances.

    Enumeration prefixes ("1.", "2)", "-", "*", "•") are removed, blank lines
    dropped, case-insensitive duplicates removed keeping the first, and the
    result truncated to n_max.
    """
    utterances: List[str] = []
    seen = set()
    for line in completion.split("\n"):
        text = strip_enumeration(line)
        if not text:
            continue
        folded = text.lower()
        if folded in seen:
            continue
        seen.add(folded)
        utterances.append(text)
        if len(utterances) == n_max:
            break
    return utterances
