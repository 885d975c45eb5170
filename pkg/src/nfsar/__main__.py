from nfsar.cli import main

main()
