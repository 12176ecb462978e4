# Subcommand modules
