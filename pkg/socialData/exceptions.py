class SmdtError(Exception):
    pass


class ValidationFailure(SmdtError):
    """Caller-fixable problem: bad input, bad config, precondition not met."""


class RuntimeFailure(SmdtError):
    """Something went wrong while doing the work: storage, network, provider."""


class InvalidStoreName(ValidationFailure):
    pass


class UnknownTable(ValidationFailure):
    def __init__(self, table):
        super().__init__(f'Unknown table "{table}"')
        self.table = table


class UnknownField(ValidationFailure):
    def __init__(self, table, field):
        super().__init__(f'Unknown field "{field}" for table "{table}"')
        self.table = table
        self.field = field


class MalformedRange(ValidationFailure):
    pass


class StoreExistsError(ValidationFailure):
    pass


class StoreMissingError(ValidationFailure):
    pass


class DestinationExistsError(ValidationFailure):
    pass


class DuplicateAdapter(ValidationFailure):
    pass


class UnknownAdapter(ValidationFailure):
    pass


class InvariantViolation(ValidationFailure):
    def __init__(self, table, index, reason, adapter=None):
        prefix = f'adapter "{adapter}" produced an invalid record: ' if adapter else ''
        super().__init__(f'{prefix}{table}[{index}]: {reason}')
        self.table = table
        self.index = index
        self.reason = reason
        self.adapter = adapter


class MalformedRecord(ValidationFailure):
    pass


class UnsupportedAlgorithm(ValidationFailure):
    pass


class PolicyError(ValidationFailure):
    pass


class ConfigError(ValidationFailure):
    pass


class MissingSecret(ValidationFailure):
    pass


class UnknownPlaceholder(ValidationFailure):
    def __init__(self, key):
        super().__init__(f'Unknown placeholder "{{{key}}}" in template')
        self.key = key


class NetworkKindError(ValidationFailure):
    pass


class StoreError(RuntimeFailure):
    pass


class TokenCollision(RuntimeFailure):
    pass


class AnonymizationFailed(RuntimeFailure):
    pass


class IngestionAborted(RuntimeFailure):
    def __init__(self, file_path, record_index, reason):
        super().__init__(f'{file_path}:{record_index}: {reason}')
        self.file_path = file_path
        self.record_index = record_index
        self.reason = reason


class ProviderError(RuntimeFailure):
    def __init__(self, message, status=None, attempts=0):
        super().__init__(message)
        self.status = status
        self.attempts = attempts


class ProviderAuthError(ProviderError):
    pass


class ProviderResponseError(ProviderError):
    pass
