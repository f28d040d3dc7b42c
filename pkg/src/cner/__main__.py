from cner.cli import main

main()
