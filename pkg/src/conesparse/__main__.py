from conesparse.cli import main

main()
