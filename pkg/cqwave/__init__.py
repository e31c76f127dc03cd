# cqwave - traveling waves of the cubic-quintic Schrodinger equation
