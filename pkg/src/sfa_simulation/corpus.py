"""
Shipped regex corpus.

Patterns in the style of a public regex library (identifiers, dates, phone
numbers, addresses), restricted to the syntax ``regex_compile`` accepts.
"""
from typing import List

REGEX_CORPUS: List[str] = [
    r"[a-zA-Z_][a-zA-Z0-9_]*",
    r"[0-9]+",
    r"-?[0-9]+(\.[0-9]+)?",
    r"[+-]?([0-9]*\.[0-9]+|[0-9]+)",
    r"0x[0-9a-fA-F]+",
    r"[01]+b",
    r"(true|false)",
    r"(yes|no|y|n)",
    r"[a-z]+@[a-z]+\.(com|org|net)",
    r"[a-zA-Z0-9._-]+@[a-zA-Z0-9-]+(\.[a-zA-Z0-9-]+)+",
    r"(http|https|ftp)://[a-z0-9.-]+(/[a-z0-9._-]*)*",
    r"www\.[a-z0-9-]+\.[a-z]+",
    r"[0-9][0-9][0-9]-[0-9][0-9][0-9]-[0-9][0-9][0-9][0-9]",
    r"\([0-9][0-9][0-9]\) ?[0-9][0-9][0-9]-[0-9][0-9][0-9][0-9]",
    r"\+?[0-9]+( [0-9]+)*",
    r"(0[1-9]|1[0-2])/(0[1-9]|[12][0-9]|3[01])/[0-9][0-9][0-9][0-9]",
    r"[0-9][0-9][0-9][0-9]-(0[1-9]|1[0-2])-(0[1-9]|[12][0-9]|3[01])",
    r"([01][0-9]|2[0-3]):[0-5][0-9](:[0-5][0-9])?",
    r"(1[0-2]|0?[1-9]):[0-5][0-9] ?(AM|PM|am|pm)",
    r"[0-9][0-9][0-9][0-9][0-9](-[0-9][0-9][0-9][0-9])?",
    r"[A-Z][A-Z]?[0-9][0-9A-Z]? ?[0-9][A-Z][A-Z]",
    r"[A-Z][0-9][A-Z] ?[0-9][A-Z][0-9]",
    r"[0-9]+ [A-Za-z]+ (Street|St|Avenue|Ave|Road|Rd)\.?",
    r"([0-9]|[1-9][0-9]|1[0-9][0-9]|2[0-4][0-9]|25[0-5])(\.([0-9]|[1-9][0-9]|1[0-9][0-9]|2[0-4][0-9]|25[0-5]))*",
    r"[0-9a-fA-F][0-9a-fA-F](:[0-9a-fA-F][0-9a-fA-F])*",
    r"#[0-9a-fA-F][0-9a-fA-F][0-9a-fA-F]([0-9a-fA-F][0-9a-fA-F][0-9a-fA-F])?",
    r"\$[0-9]+(,[0-9][0-9][0-9])*(\.[0-9][0-9])?",
    r"[0-9]+(\.[0-9]+)?%",
    r"[A-Z][a-z]+( [A-Z][a-z]+)*",
    r"[A-Z][a-z]*(-[A-Z][a-z]*)?",
    r"(Mr|Mrs|Ms|Dr)\.? [A-Z][a-z]+",
    r"[a-z]+(_[a-z]+)*",
    r"[a-z]+([A-Z][a-z]*)*",
    r"[A-Z]+(_[A-Z]+)*",
    r"/\*([^*]|\*+[^*/])*\*+/",
    r"//[^\n]*",
    r"\"([^\"\\]|\\.)*\"",
    r"'([^'\\]|\\.)*'",
    r"<[a-zA-Z]+( [a-zA-Z]+=\"[^\"]*\")*/?>",
    r"</[a-zA-Z]+>",
    r"[a-zA-Z]:\\([a-zA-Z0-9_]+\\)*[a-zA-Z0-9_]*",
    r"(/[a-zA-Z0-9._-]+)+/?",
    r"[a-zA-Z0-9]+\.(jpg|jpeg|png|gif|bmp)",
    r"[0-9][0-9][0-9]-[0-9][0-9]-[0-9][0-9][0-9][0-9]",
    r"[0-9][0-9][0-9][0-9]( ?[0-9][0-9][0-9][0-9])*",
    r"(a|b)*abb",
    r"(ab|cd)+",
    r"(a|ab)(c|bcd)(d*)",
    r"((a|b)(a|b))*",
    r"[a-c]*[b-d]+[a-d]?",
    r"(x+x+)+y",
    r"[^aeiou ]+",
    r"\s*[a-z]+\s*=\s*[0-9]+\s*;",
    r"\w+(\.\w+)*",
]


def regex_corpus() -> List[str]:
    return list(REGEX_CORPUS)
