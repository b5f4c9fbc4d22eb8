class CSyntaxError(Exception):
    """Malformed program text, with the offending location."""

    def __init__(self, line, column, message):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class UnsupportedConstruct(Exception):
    """Valid C that falls outside the accepted subset."""

    def __init__(self, line, construct):
        super().__init__(f"line {line}: unsupported construct '{construct}'")
        self.line = line
        self.construct = construct
