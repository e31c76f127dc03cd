# Core numerical components
