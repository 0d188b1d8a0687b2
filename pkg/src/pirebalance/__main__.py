from pirebalance.cli import main

main()
