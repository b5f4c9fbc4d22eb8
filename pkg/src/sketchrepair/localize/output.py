"""Automaton over program output text accepting exactly the outputs that
normalize to a given expected text (see ``decider.suite.normalize_output``).

States:
  ('m', i)  matched expected[:i] exactly
  ('w', i)  matched expected[:i], then trailing whitespace on the line
  ('t',)    whole text matched; only blank padding may follow
"""

from ..decider.suite import _TRAILING_WS, normalize_output

START = ("m", 0)
END = ("t",)


class OutputAutomaton:
    def __init__(self, expected):
        self.text = normalize_output(expected)
        self.n = len(self.text)

    def step(self, state, ch):
        text, n = self.text, self.n
        if state == END:
            return END if ch == "\n" or ch in _TRAILING_WS else None
        kind, i = state
        if kind == "m" and i < n and text[i] == ch:
            return ("m", i + 1)
        if ch == "\n":
            if i < n and text[i] == "\n":
                return ("m", i + 1)
            return END if i == n else None
        if ch in _TRAILING_WS:
            return END if i == n else ("w", i)
        return None

    def run(self, state, s):
        for ch in s:
            state = self.step(state, ch)
            if state is None:
                return None
        return state

    def accepting(self, state):
        return state == END or state == ("m", self.n)

    def matches(self, s):
        end = self.run(START, s)
        return end is not None and self.accepting(end)
