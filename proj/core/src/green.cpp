namespace slq {}
