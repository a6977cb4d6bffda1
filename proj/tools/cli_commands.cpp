namespace lvlab {}
