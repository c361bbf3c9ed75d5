from valgen.cli import main

main()
