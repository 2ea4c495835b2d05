"""Instruction normalization (the prompt-engineering step before encoding)."""

from pydantic import BaseModel, ConfigDict

from .errors import EmptyInstructionError


class PromptTemplate(BaseModel):
    """Prefix and suffix wrapped around an instruction, and whether to lowercase it."""

    model_config = ConfigDict(frozen=True)

    prefix: str = ""
    suffix: str = ""
    lowercase: bool = True


def _carries_prefix(text: str, prefix: str) -> bool:
    """Whether `text` starts with `prefix` as whole words rather than inside a longer word."""
    if not text.startswith(prefix):
        return False
    rest = text[len(prefix):]
    return not rest or not (prefix[-1].isalnum() and rest[0].isalnum())


def _carries_suffix(text: str, suffix: str) -> bool:
    if not text.endswith(suffix):
        return False
    rest = text[:len(text) - len(suffix)]
    return not rest or not (suffix[0].isalnum() and rest[-1].isalnum())


def _join(left: str, right: str) -> str:
    # keep words apart when the template has no separating whitespace
    if left and right and left[-1].isalnum() and right[0].isalnum():
        return f"{left} {right}"
    return left + right


def normalize_instruction(text: str, template: PromptTemplate = PromptTemplate()) -> str:
    """Trim `text`, optionally lowercase it, and apply the prefix and suffix exactly once.

    Text that already carries the prefix or suffix as whole words is not
    wrapped again, so normalizing a normalized instruction returns it
    unchanged. A prefix that only matches the start of a longer word
    ("a" against "apple") does not count as present.
    """
    text = (text or "").strip()
    if not text:
        raise EmptyInstructionError()
    prefix, suffix = template.prefix, template.suffix
    if template.lowercase:
        text, prefix, suffix = text.lower(), prefix.lower(), suffix.lower()
    if prefix.strip() and not _carries_prefix(text, prefix.lstrip()):
        text = _join(prefix, text)
    if suffix.strip() and not _carries_suffix(text, suffix.rstrip()):
        text = _join(text, suffix)
    return text.strip()
