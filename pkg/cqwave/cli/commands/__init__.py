"""CLI subcommands, each exposing add_parser(subparsers) and execute(args)."""
