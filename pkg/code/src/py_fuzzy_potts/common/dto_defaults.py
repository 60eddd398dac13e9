# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""Basic classes to use to create DTOs using `attrs`_.

Rational fields (:py:class:`fractions.Fraction`) are written as ``{"exact": "a/b", "decimal": "..."}``
by :py:meth:`HasFromDict.as_dict` with ``for_json=True`` and read back from either that form or a plain
``"a/b"`` string by :py:meth:`HasFromDict.from_dict`.

.. attrs: https://www.attrs.org/en/stable/
"""
import enum
import json
import typing
from fractions import Fraction
from typing import TYPE_CHECKING, Any, Dict, Optional, Type, Union

import attrs

if TYPE_CHECKING:
    from typing_extensions import Self

from py_fuzzy_potts.common import exact, logger, preprocess

_LOGGER = logger.get(__name__)


class HasIsEmpty:  # pylint: disable=too-few-public-methods
    """To add :py:meth:`is_empty` to children."""

    def is_empty(self) -> bool:
        """Check all fields and returns :py:obj:`True` if they are all
        :py:obj:`None`.
        """
        return all(val is None for val in attrs.asdict(self, recurse=False).values())  # type: ignore


class HasPatchWith(HasIsEmpty):
    """To add :py:meth:`patch_with` to children.

    Used to layer command line overrides on top of a configuration file: fields left as :py:obj:`None`
    in the override are taken from the base.
    """

    def patch_is_substitution(self) -> bool:
        """Controls how :py:meth:`patch_with` works. If it is complete
        substitution or a merge.
        """
        return False

    def patch_with(self, value: Any) -> Any:
        """The behavior depends on :py:meth:`patch_is_substitution`. The
        argument `value` is only considered if it is of the same type as
        current instance.

        If :py:meth:`patch_is_substitution` is :py:obj:`True` will return only return `value`
        if the current instance is empty, i.e., :py:meth:`is_empty` returns :py:obj:`True`.

        If :py:meth:`patch_is_substitution` is :py:obj:`False`,
        every field of the current instance that is :py:obj:`None` is taken from `value`.

        **NOTE**: It never changes the involved objects.

        Args:
            value: the base to patch from.

        Returns:
            The patched object.
        """
        result = self
        if self.patch_is_substitution():
            if self.is_empty() and isinstance(value, self.__class__):
                result = value
        elif isinstance(value, self.__class__):
            result = self._merge(value)
        return result

    def _merge(self, value: Any) -> Any:
        kwargs = {}
        for field in list(attrs.fields(self.__class__)):  # type: ignore
            self_field = getattr(self, field.name)
            value_field = getattr(value, field.name)
            kwargs[field.name] = self_field if self_field is not None else value_field
        try:
            result = self.__class__(**kwargs)
        except Exception as err:
            raise ValueError(
                f"Could not instantiate '{self.__class__.__name__}' from kwargs '{kwargs}'. Error: {err}"
            ) from err
        return result


class HasFromDict(HasPatchWith):
    """To add :py:meth:`from_dict` to children."""

    def as_dict(self, *, for_json: Optional[bool] = False) -> Dict[str, Any]:
        """Field by field conversion into a :py:class:`dict`.

        With ``for_json`` rationals, enums and nested DTOs become JSON compatible values.
        """
        result = {}
        for field in list(attrs.fields(self.__class__)):  # type: ignore
            field_value = getattr(self, field.name)
            if isinstance(field_value, HasFromDict):
                field_value = field_value.as_dict(for_json=for_json)
            elif for_json:
                field_value = _jsonable(field_value)
            result[field.name] = field_value
        return result

    def clone(self, **overwrite) -> "Type[Self]":
        """Will create a new instance of the same type and apply overwrites, if
        given.
        """
        kwargs = {field.name: getattr(self, field.name) for field in attrs.fields(self.__class__)}  # type: ignore
        for key, val in overwrite.items():
            if key in kwargs:
                kwargs[key] = val
        return self.__class__(**kwargs)  # type: ignore

    @classmethod
    def from_dict(cls, value: Dict[str, Any]) -> Any:
        """Converts a simple :py:class:`dict` into an instance of the current
        class.

        Args:
            value: usually from :py:func:`json.loads`.

        Returns:
            An instance of ``cls``.
        """
        kwargs = {}
        if isinstance(value, dict):
            kwargs = cls._create_kwargs(value)
        try:
            result: HasFromDict = cls(**kwargs)
        except Exception as err:
            raise ValueError(f"Could not instantiate '{cls.__name__}' from kwargs '{kwargs}'. Error: {err}") from err
        return result

    @classmethod
    def _create_kwargs(cls, value: Dict[str, Any]) -> Dict[str, Any]:
        """Because of how :py:module:`attrs` works, the `value` must be trimmed
        to the exact attributes available to be used as `kwargs`.

        **NOTE**: It a field is of type :py:class:`HasFromDict`
                  it will call :py:meth:`from_dict` recursively.
        """
        result = {}
        unknown = sorted(set(value) - {field.name for field in attrs.fields(cls)})  # type: ignore
        if unknown:
            _LOGGER.warning("Ignoring unknown keys %s for type '%s'", unknown, cls.__name__)
        for field in list(attrs.fields(cls)):  # type: ignore
            field_value = value.get(field.name)
            if field_value is not None:
                if _is_of_type(field.type, HasFromDict):
                    field_value = _concrete_type(field.type).from_dict(field_value)
                elif _is_of_type(field.type, EnumWithFromStrIgnoreCase) and isinstance(field_value, str):
                    field_value = _concrete_type(field.type).from_str(field_value)
                elif _is_of_type(field.type, Fraction):
                    field_value = _parse_rational(field_value, field.name)
                result[field.name] = field_value
        return result


def _jsonable(value: Any) -> Any:
    if isinstance(value, HasFromDict):
        result = value.as_dict(for_json=True)
    elif isinstance(value, (list, tuple)):
        result = [_jsonable(val) for val in value]
    elif isinstance(value, dict):
        result = {str(key): _jsonable(val) for key, val in value.items()}
    else:
        result = exact.to_jsonable(value)
    return result


def _parse_rational(value: Any, name: str) -> Fraction:
    if isinstance(value, dict) and "exact" in value:
        value = value["exact"]
    return preprocess.rational(value, name)


def _is_of_type(cls: Any, target: type) -> bool:
    if isinstance(cls, type):
        result = issubclass(cls, target)
    else:
        # it is declared like Optional[MyClass]
        result = typing.get_origin(cls) is Union and any(
            isinstance(arg, type) and issubclass(arg, target) for arg in typing.get_args(cls)
        )
    return result


def _concrete_type(cls: Any) -> Any:
    result = cls
    if not isinstance(cls, type):
        result = next(arg for arg in typing.get_args(cls) if isinstance(arg, type) and arg is not type(None))
    return result


class HasFromJsonString(HasFromDict):
    """To add :py:meth:`from_json` to children."""

    @classmethod
    def from_json(cls, json_string: str, context: Optional[str] = None) -> Any:
        """Will parse `json_string` and use :py:meth:`from_dict` to get the
        instance.

        Args:
            json_string: JSON object text.
            context: added to the error message, e.g. the file name.

        Returns:
            An instance of ``cls``.
        """
        try:
            value = json.loads(json_string)
        except Exception as err:
            error_context = f". Context: {context}" if context else ""
            raise ValueError(
                f"Could not parse JSON string for type '{cls.__name__}'{error_context}. Error: {err}"
            ) from err
        result: HasFromJsonString = cls.from_dict(value)
        return result

    def as_json(self) -> str:
        """Converts the current object into a deterministic JSON string (sorted keys)."""
        try:
            value_dict = self.as_dict(for_json=True)
        except Exception as err:
            raise ValueError(
                f"Could not convert '{self}' to a dictionary for type {self.__class__.__name__}. Error: {err}"
            ) from err
        return json.dumps(value_dict, sort_keys=True, indent=2)


class EnumWithFromStrIgnoreCase(enum.Enum):
    """To add :py:meth:`from_str` to children."""

    @classmethod
    def from_str(cls, value: Optional[str]) -> Any:
        """Parses a string value into corresponding :py:class:`enum.Enum`
        comparing it with the values and ignoring case.
        """
        result: Union[EnumWithFromStrIgnoreCase | None] = None
        if value is not None:
            for val in cls:
                if val.value.lower() == value.lower().strip():
                    result = val
                    break
        return result

    @classmethod
    def values(cls) -> typing.List[str]:
        """All values, in declaration order, e.g. for :py:class:`click.Choice`."""
        return [val.value for val in cls]
