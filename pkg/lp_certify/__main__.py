from lp_certify.main import main

main()
