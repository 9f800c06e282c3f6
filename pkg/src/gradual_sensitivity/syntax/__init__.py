"""Surface syntax: tokens, lexer, parser, desugaring and the pretty-printer."""
