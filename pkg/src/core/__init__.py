# Core module: exceptions, interfaces and the shared component base
