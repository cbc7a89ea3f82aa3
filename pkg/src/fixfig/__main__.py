from fixfig.cli import main

raise SystemExit(main())
