import re

import traitlets

RANGE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")


class Schema(traitlets.Any):
    """any... but validated by a jsonschema.Validator"""

    _validator = None

    def __init__(self, validator, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._validator = validator

    def validate(self, obj, value):
        errors = list(self._validator.iter_errors(value))
        if errors:
            raise traitlets.TraitError(
                ("""schema errors:\n""" """\t{}\n""" """for:\n""" """{}""").format(
                    "\n\t".join([error.message for error in errors]), value
                )
            )
        return value


class LoadableCallable(traitlets.TraitType):
    """A trait which (maybe) loads a callable."""

    info_text = "a loadable callable"

    def validate(self, obj, value):
        if isinstance(value, str):
            try:
                value = traitlets.import_item(value)
            except Exception:
                self.error(obj, value)

        if callable(value):
            return value
        else:
            self.error(obj, value)


def parse_int_list(text: str):
    """``"3,4,5"`` or ``"1..8"`` (inclusive) as a list of ints"""
    match = RANGE.match(text)
    if match:
        first, last = map(int, match.groups())
        return list(range(first, last + 1))
    return [int(item) for item in text.split(",") if item.strip()]


class IntList(traitlets.TraitType):
    """A list of ints, which may be given as a comma list or an a..b range"""

    info_text = "a list of integers, a comma-separated list or an a..b range"
    default_value: list = []

    def from_string(self, s):
        try:
            return parse_int_list(s)
        except ValueError:
            raise traitlets.TraitError(f"not a list of integers: {s!r}") from None

    def validate(self, obj, value):
        if isinstance(value, str):
            value = self.from_string(value)
        if isinstance(value, int) and not isinstance(value, bool):
            value = [value]
        try:
            value = [int(item) for item in value]
        except (TypeError, ValueError):
            self.error(obj, value)
        return value
