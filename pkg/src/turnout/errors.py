"""Exception hierarchy.

Everything a user-supplied file can trigger derives from ``InputError``;
misuse of the library API raises plain ``ValueError``.
"""


class InputError(Exception):
    """Invalid user-supplied content (schema, data, matrix, or model file)."""


class SchemaError(InputError):
    """Schema document violates the grammar or a schema invariant."""


class DataError(InputError):
    """Data file content cannot be mapped onto the schema."""


class ModelFileError(InputError):
    """Model document is malformed, truncated, or has an unsupported version."""


class SchemaMismatchError(InputError):
    """Prediction input does not match the schema the model was trained on."""
