import datetime

from django.core.exceptions import ValidationError
from django.db import models

from socialData.exceptions import InvariantViolation
from unifiedsocial.utils import format_timestamp, parse_timestamp, to_utc


class StandardRecord(models.Model):
    """
    Base of every unified-schema table. Concrete tables declare which of their fields are counts,
    timestamps and geo pairs, and which fields make two rows duplicates of each other.
    """
    class Meta:
        abstract = True

    TABLE = None
    COUNT_FIELDS = []
    TIMESTAMP_FIELDS = ['created_at', 'retrieved_at']
    GEO_FIELDS = []
    ID_FIELDS = []
    DEDUP_FIELDS = []
    # Non-nullable member of DEDUP_FIELDS used to look existing keys up in bulk
    DEDUP_LOOKUP_FIELD = None

    @classmethod
    def schema_fields(cls):
        return [f.name for f in cls._meta.concrete_fields if not f.primary_key]

    def dedup_key(self):
        return tuple(getattr(self, name) for name in self.DEDUP_FIELDS)

    def check_types(self):
        """
        Strict checks that must run before full_clean, which would otherwise quietly coerce
        "12" into 12 or a naive datetime into local time.
        """
        errors = {}
        for name in self.COUNT_FIELDS:
            value = getattr(self, name)
            if value is not None and (isinstance(value, bool) or not isinstance(value, int)):
                errors[name] = f'must be an integer, got {value!r}'
            elif value is not None and value < 0:
                errors[name] = f'must be >= 0, got {value}'
        for name in self.TIMESTAMP_FIELDS:
            value = getattr(self, name)
            if value is None:
                continue
            if not isinstance(value, datetime.datetime):
                errors[name] = f'must be a datetime, got {value!r}'
            elif value.tzinfo is None:
                errors[name] = 'must be timezone aware'
            else:
                setattr(self, name, to_utc(value))
        for name in self.GEO_FIELDS:
            value = getattr(self, name)
            if value is None:
                continue
            if isinstance(value, (list, tuple)) and len(value) == 2 and \
                    all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value):
                lat, lon = value
                if not -90 <= lat <= 90 or not -180 <= lon <= 180:
                    errors[name] = f'coordinates out of range: {value!r}'
                else:
                    setattr(self, name, [float(lat), float(lon)])
            else:
                errors[name] = f'must be a (lat, lon) pair, got {value!r}'
        for name in self.ID_FIELDS:
            value = getattr(self, name)
            if value is not None and not isinstance(value, str):
                errors[name] = f'must be a string id, got {value!r}'
        if errors:
            raise ValidationError(errors)

    def validate(self, index=0):
        try:
            self.check_types()
            self.full_clean(validate_unique=False, validate_constraints=False)
        except ValidationError as e:
            raise InvariantViolation(self.TABLE, index, describe_validation_error(e))

    def to_json_dict(self):
        output = {}
        for name in self.schema_fields():
            value = getattr(self, name)
            if name in self.TIMESTAMP_FIELDS:
                value = format_timestamp(value)
            output[name] = value
        return output

    @classmethod
    def from_json_dict(cls, data):
        fields = cls.schema_fields()
        unknown = set(data) - set(fields)
        if unknown:
            raise ValueError(f'Unexpected keys for {cls.TABLE}: {sorted(unknown)}')
        values = {}
        for name in fields:
            value = data.get(name)
            if name in cls.TIMESTAMP_FIELDS:
                value = parse_timestamp(value)
            values[name] = value
        return cls(**values)

    def __str__(self):
        return f'{self.TABLE}{self.dedup_key()}'


def describe_validation_error(error):
    if hasattr(error, 'error_dict'):
        parts = []
        for field, messages in sorted(error.message_dict.items()):
            label = 'record' if field == '__all__' else field
            parts.append(f'{label}: {" ".join(messages)}')
        return '; '.join(parts)
    return ' '.join(error.messages)


def check_not_after(errors, record, earlier, later):
    first = getattr(record, earlier)
    second = getattr(record, later)
    if first is not None and second is not None and first > second:
        errors.append(ValidationError(f'{earlier} is after {later}'))
