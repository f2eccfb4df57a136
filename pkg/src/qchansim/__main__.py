from qchansim.cli import main

main()
