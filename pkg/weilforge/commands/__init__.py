from weilforge.commands import estimate, example, polarize, solve, verify

COMMANDS = (example, solve, polarize, verify, estimate)
